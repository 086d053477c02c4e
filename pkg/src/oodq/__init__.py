"""Static object-oriented design-quality analyzer."""

__version__ = "0.1.0"
