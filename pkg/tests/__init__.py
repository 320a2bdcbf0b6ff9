"""
Test suite for the ELM advisor.
"""
