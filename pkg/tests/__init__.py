"""
Tests unitaires de SeqCap
"""
