"""
Service layer: test problems, diagnostics and experiment orchestration.
"""
