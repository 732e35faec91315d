# Keeps the tests directory importable (oracles.py) regardless of rootdir.
