"""
Utilities
=========
Environment-driven settings shared by the CLI and backend.
"""

from .settings import Settings, get_settings

__all__ = ['Settings', 'get_settings']

__version__ = '1.0.0'
