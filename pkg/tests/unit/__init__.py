"""
Unit tests for the ELM advisor.
"""
