from .loader import CONFIG_PATH, RunConfig, load_config

__all__ = ["CONFIG_PATH", "RunConfig", "load_config"]
