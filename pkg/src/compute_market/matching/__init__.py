"""Offer feasibility and the solver's matching algorithms."""
