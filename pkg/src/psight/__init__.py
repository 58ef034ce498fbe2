"""psight: perceptual grouping assessment and design suggestions for SVG charts."""

__version__ = "0.1.0"
