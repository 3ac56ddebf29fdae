# Empty or with basic package info
__version__ = "0.1.0"
