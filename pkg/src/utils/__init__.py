"""Fixture JSON schemas."""
