"""
Core modules: configurazione, modelli, eccezioni
"""
