# Solver test suite
