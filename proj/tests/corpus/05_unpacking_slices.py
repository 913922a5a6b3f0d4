a, b = 1, 2
[c, d] = [b, a]
head = items[:2]
tail = items[1:]
step = items[::2]
first = items[0]
for k, v in pairs:
    pass

# expect 1: simple_assignment, tuple_unpacking, tuple_literal
# expect 2: simple_assignment, tuple_unpacking, list_literal
# expect 3: simple_assignment, slice_expression
# expect 4: simple_assignment, slice_expression
# expect 5: simple_assignment, slice_expression
# expect 6: simple_assignment
# expect 7: for_statement, tuple_unpacking
