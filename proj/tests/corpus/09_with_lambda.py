with open(path) as fh:
    lines = fh.readlines()
key = lambda row: row[1]
ordered = sorted(lines, key=key)

# expect 1: with_statement, function_call
# expect 2: simple_assignment, function_call
# expect 3: simple_assignment, lambda_expression
# expect 4: simple_assignment, function_call
