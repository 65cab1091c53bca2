# criterion key -> PASS/FAIL line, filled by tests/test_acceptance.py
RESULTS = {}
