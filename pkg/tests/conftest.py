from hypothesis import HealthCheck, settings

# JIT warm-up and allocation jitter make per-example deadlines noisy
settings.register_profile(
    "default",
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")
