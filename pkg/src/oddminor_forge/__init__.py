"""Counterexample graphs for the odd Hadwiger conjecture, built and audited at desk scale."""

__version__ = "0.1.0"
SCHEMA = "oddminor-forge/1"
