import os

from .errors import ResourceError

DEFAULT_CAP = 10**7


def enumeration_cap(cap=None):
    if cap is not None:
        return int(cap)
    env = os.environ.get("RSFORGE_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP


def guard(size, cap=None, what="domain"):
    limit = enumeration_cap(cap)
    if size > limit:
        raise ResourceError(f"{what} of size {size} exceeds enumeration cap {limit}")
    return size
