"""Turning full, central and ratio maps into detection polygons."""
