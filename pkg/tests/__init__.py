"""
CWFA test suite
Unit, integration and acceptance tests (see run_tests.py).
"""
