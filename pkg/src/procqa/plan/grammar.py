"""EBNF for the plan DSL; embedded in planner prompts and mirrored in docs."""

GRAMMAR_EBNF = """\
plan        = { pragma | step | comment | blank } ;
pragma      = "#!" ( "question:" string | "qa_type:" name ) ;
comment     = "#" text-to-eol ;
step        = ident "=" toolname "(" [ arg { "," arg } ] ")" ;
arg         = ident "=" value ;
value       = string | number | boolean | span | list | ident ;
string      = '"' { character | escape } '"' ;        (* \\" \\\\ \\n \\t \\r *)
number      = integer | real ;
boolean     = "true" | "false" ;
span        = "[" number "," number "]" ;             (* seconds; start < end *)
list        = "[" [ value { "," value } ] "]" ;       (* two numbers = span *)
ident       = lowercase { lowercase | digit | "_" } ;
toolname    = letter { letter | digit | "_" } ;
"""
