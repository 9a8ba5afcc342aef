# Free group words, edge-weight classes, decision procedures, splitting complexes and the path oracle
