"""
chainmap
Mappe di catene tra complessi simpliciali: complesso Hom, classi di omotopia e
selezione di rappresentanti tramite ottimizzazione
"""

__version__ = "1.0.0"
