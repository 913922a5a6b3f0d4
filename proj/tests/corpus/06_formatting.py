name = 'x'
a = 'hello %s' % name
b = '{} and {}'.format(name, name)
c = f'{name}!'
d = 10 % 3
e = name.upper()

# expect 1: simple_assignment
# expect 2: simple_assignment, string_formatting
# expect 3: simple_assignment, string_formatting
# expect 4: simple_assignment, string_formatting
# expect 5: simple_assignment, arithmetic_expression
# expect 6: simple_assignment, function_call
