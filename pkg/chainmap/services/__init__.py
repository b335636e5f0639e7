"""
Services: algebra, complessi, complesso Hom, ottimizzazione, applicazioni, I/O
"""
