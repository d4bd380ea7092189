"""
Test package for Python Helpers Library

This package contains unit tests and integration tests for all modules.
"""