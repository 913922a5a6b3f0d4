"""Only constructs outside the vocabulary."""
pass
x: int
del y
