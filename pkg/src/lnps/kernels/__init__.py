from ._jit import DISABLE_ENV, JIT_ENABLED

__all__ = ["DISABLE_ENV", "JIT_ENABLED"]
