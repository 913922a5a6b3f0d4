for i in x:
    if i:
        break
matrix = [[i for i in row] for row in rows]
data = {'k': [1, [2]]}

# expect 1: for_statement
# expect 2: if_statement
# expect 3: break_statement
# expect 4: simple_assignment, list_comprehension, list_comprehension
# expect 5: simple_assignment, dict_literal, nested_list, list_literal
