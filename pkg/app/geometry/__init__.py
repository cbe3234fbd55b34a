"""Exact polygon math: orientation, area, miter offsetting, hulls and overlap."""
