from hypothesis import HealthCheck, settings

# exact integer arithmetic has uneven per-example cost; disable the wall-clock
# deadline so property tests stay deterministic under load
settings.register_profile(
    "rhoq", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("rhoq")
