# Numerical kernels, seeded generators, trial strategies and storage
