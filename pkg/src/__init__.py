"""
SeqCap : bornes sur les compositions séquentielles de canaux quantiques corrigés
"""
