"""Twenty valid NetLogo snippets shared by the linter mutation tests.

Every snippet lints clean against the bundled dictionary, contains at
least one dictionary primitive, opens a procedure with to/to-report and
uses at least one bracket, so all three mutation kinds apply.
"""

VALID_SNIPPETS = [
    "to setup\n  clear-all\n  create-turtles 30 [ setxy random-xcor random-ycor ]\n  reset-ticks\nend",
    "to go\n  ask turtles [ fd 1 rt random 30 ]\n  tick\nend",
    "globals [ total ]\nto accumulate\n  set total total + count turtles\nend",
    "to wiggle [ amount ]\n  rt random amount\n  lt random amount\n  fd 0.5\nend",
    "to-report average-size\n  report mean [size] of turtles\nend",
    "breed [wolves wolf]\nto spawn-wolves\n  create-wolves 5 [ set color gray ]\nend",
    "turtles-own [energy]\nto feed\n  ask turtles [ set energy energy + 1 ]\nend",
    "to paint\n  ask patches [ set pcolor scale-color green pxcor min-pxcor max-pxcor ]\nend",
    "to cull\n  ask turtles with [size > 2] [ die ]\nend",
    "to scatter\n  ask turtles [ move-to one-of patches ]\nend",
    "to-report biggest\n  report max-one-of turtles [size]\nend",
    "to march\n  foreach sort turtles [ t -> ask t [ fd 1 ] ]\nend",
    'to greet\n  print "hello world"\n  show count patches\nend',
    "to branch\n  ifelse ticks > 100 [ stop ] [ tick ]\nend",
    "to-report doubled [x]\n  report x * 2\nend",
    "to pulse\n  every 0.5 [ ask turtles [ set size size + 0.1 ] ]\nend",
    "to link-up\n  ask turtles [ create-links-with other turtles-here ]\nend",
    "patches-own [food]\nto harvest\n  ask patches with [food > 0] [ set food food - 1 ]\nend",
    'to chart\n  set-current-plot "counts"\n  plot count turtles\nend',
    "to relocate\n  ask turtles [ if can-move? 1 [ jump 1 ] ]\nend",
]
