from .scatpoles import *  # noqa: F403
