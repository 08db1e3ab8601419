"""
Test package for the Leavitt path algebra toolkit.
"""
