def outer(factor):
    def plain(x):
        return x
    def scaled(x):
        return x * factor
    return plain, scaled

# expect 1: function_definition
# expect 2: function_definition
# expect 3: return_statement
# expect 4: closure
# expect 5: return_statement, arithmetic_expression
# expect 6: return_statement, tuple_literal
