"""
Test package for su11sense.

This package contains unit tests for the su11sense library and CLI.
"""
