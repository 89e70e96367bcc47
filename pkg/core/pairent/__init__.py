# Pair-basis entanglement toolkit
__version__ = "0.1.0"
