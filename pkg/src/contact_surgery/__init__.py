"""Contact round surgery and Lutz twists on exact slope and angle data."""

__version__ = "0.1.0"
