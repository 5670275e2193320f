"""Renormalisation data and scaling-limit classification for near-critical
phase coexistence models."""

__version__ = "0.1.0"
