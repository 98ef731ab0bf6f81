"""Semantic annotation and knowledge-graph querying for Sanskrit glossary corpora."""

__version__ = "0.1.0"
