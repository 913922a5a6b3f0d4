def connect(host, port=80, *args, timeout=5, **options):
    return host, port

# expect 1: function_definition, default_parameter, star_args_parameter
# expect 1: default_parameter, kw_args_parameter
# expect 2: return_statement, tuple_literal
