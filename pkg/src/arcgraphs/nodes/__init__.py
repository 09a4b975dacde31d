"""Nodes package."""
