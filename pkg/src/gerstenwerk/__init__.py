"""Exact computations of Gerstenhaber brackets and extension-category models over F_p."""
