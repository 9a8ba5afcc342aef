# Sphere decision library and command line
