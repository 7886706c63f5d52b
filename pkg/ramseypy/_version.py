version_info = (0, 1, 0, "b1")
__version__ = ".".join(map(str, version_info))
