class Meta(type):
    def __new__(mcs, name, bases, ns):
        return super().__new__(mcs, name, bases, ns)

class Model(metaclass=Meta):
    pass

# expect 1: metaclass
# expect 2: dunder_new
# expect 3: return_statement, function_call, function_call
# expect 5: metaclass
