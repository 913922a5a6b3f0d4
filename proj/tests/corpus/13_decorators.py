import functools

@functools.lru_cache(maxsize=None)
def fib(n):
    return n if n < 2 else fib(n - 1) + fib(n - 2)

# expect 1: import_statement
# expect 3: decorator, function_call
# expect 4: function_definition
# expect 5: return_statement, conditional_expression, comparison_expression
# expect 5: arithmetic_expression, arithmetic_expression, arithmetic_expression
# expect 5: function_call, function_call
