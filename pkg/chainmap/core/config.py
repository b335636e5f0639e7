"""
Configuration management per chainmap
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Impostazioni caricate da variabili d'ambiente (prefisso CHAINMAP_) e da .env"""

    # Application Settings
    debug: bool = False
    log_level: str = "INFO"
    default_seed: int = 0
    threads: int = 0  # CHAINMAP_THREADS: 0 = tutti i core; l'output non dipende dal valore

    # Algebra
    float_tolerance: float = 1e-9  # Soglia assoluta dello zero in virgola mobile

    # Enumerazione e ricerche Z/2
    enumeration_cap: int = 24  # Massimo numero di omotopie enumerabili (2^cap vettori)
    anneal_t0: float = 10.0
    anneal_cooling: float = 0.999  # T_k = T0 * cooling^k
    anneal_iterations: int = 25300
    random_walk_steps: int = 1000
    greedy_restarts: int = 0

    # Complessi
    witness_nu: int = 1  # Parametro nu del lazy-witness (documentato, esposto come flag)

    # Programmazione lineare
    lp_backend: str = "auto"  # auto | simplex | highs
    lp_simplex_max_vars: int = 400  # Oltre questa soglia "auto" passa a HiGHS
    lp_max_iterations: int = 50000
    lp_optimum_slack: float = 1e-9  # Tolleranza sul vincolo di ottimo nella seconda fase

    # Complesso Hom
    hom_rank_check_limit: int = 1500  # Massima |Hom_0| per il controllo di rango per eliminazione

    # Discesa del gradiente
    descent_max_iter: int = 500
    descent_tolerance: float = 1e-12  # Soglia sul quadrato della norma del gradiente
    armijo: float = 1e-4
    backtrack: float = 0.5
    initial_step: float = 1.0

    # Alexander-Whitney
    aw_restarts: int = 2
    aw_restart_scale: float = 0.1
    aw_symmetric: bool = True

    # Applicazioni
    circle_max_angle_step: float = 0.5  # Massimo spostamento angolare per passo (radianti)
    density_bandwidth: float = 0.25
    density_restarts: int = 2
    density_restart_scale: float = 0.1
    round_threshold: float = 0.5
    vertex_search_restarts: int = 100

    # Paths
    data_output_path: str = "data_output"

    class Config:
        env_file = ".env"
        env_prefix = "CHAINMAP_"
        case_sensitive = False


settings = Settings()
