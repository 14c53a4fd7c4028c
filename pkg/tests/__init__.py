"""
Tests package for canonlink.
"""

# Make this directory a Python package
