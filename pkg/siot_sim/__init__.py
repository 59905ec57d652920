"""
SIoT Sharing Simulator v1.0
Agent-based simulation of resource sharing among socially connected IoT peers
"""

__version__ = "1.0.0"
__author__ = "SIoT Simulator Team"
