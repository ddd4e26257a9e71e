"""
Test suite for the scorecard project
"""
