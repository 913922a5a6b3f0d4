count: int = 0
count += 1

# expect 1: simple_assignment
# expect 2: augmented_assignment
