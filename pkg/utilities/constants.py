class Constants:
    REPORT_DIR_ENV: str = "WZ_REPORT_DIR"
    DEFAULT_FORMAT: str = "text"
    LOG_FORMAT: str = "%(asctime)s [%(levelname)8s] %(message)s (%(filename)s:%(lineno)s)"
    LOG_DATE_FORMAT: str = "%Y-%m-%d %H:%M:%S"

    # exact core
    PRIMALITY_BOUND: int = 10**6

    # telescoping identities grid
    IDENTITY_L_MAX: int = 6
    IDENTITY_S_MAX: int = 4
    IDENTITY_M_EXTENT: int = 20

    # certificate grid
    WZ_L_MAX: int = 5
    WZ_S_MAX: int = 4
    WZ_N_EXTENT: int = 10
    RATIO_SAMPLES: int = 500
    RATIO_SEED: int = 20211

    # supercongruences
    PRIMES: tuple[int, ...] = (3, 5, 7, 11, 13)
    R_MAX: int = 2
    MAX_TERMS: int = 2 * 10**4

    # exit codes
    EXIT_OK: int = 0
    EXIT_FAILURE: int = 1
    EXIT_USAGE: int = 2
