counter = 0

def bump():
    global counter
    counter += 1

def make():
    count = 0
    def inner():
        nonlocal count
        count += 1
        return count
    return inner

# expect 1: simple_assignment
# expect 3: function_definition
# expect 4: global_statement
# expect 5: augmented_assignment
# expect 7: function_definition
# expect 8: simple_assignment
# expect 9: closure
# expect 10: nonlocal_statement
# expect 11: augmented_assignment
# expect 12: return_statement
# expect 13: return_statement
