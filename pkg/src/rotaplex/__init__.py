"""rotaplex: exact rational polyhedral geometry and rotation complexes."""

__version__ = "0.1.0"
