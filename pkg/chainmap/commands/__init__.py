"""
Comandi CLI: un modulo per gruppo di sottocomandi
"""
