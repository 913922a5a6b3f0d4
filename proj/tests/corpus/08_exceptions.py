try:
    value = int(text)
except ValueError as exc:
    raise RuntimeError('bad') from exc
else:
    value += 1
finally:
    done = True
assert value > 0, 'positive'

# expect 1: try_except
# expect 2: simple_assignment, function_call
# expect 4: raise_statement, function_call
# expect 5: else_clause
# expect 6: augmented_assignment
# expect 8: simple_assignment
# expect 9: assert_statement, comparison_expression
