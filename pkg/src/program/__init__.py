"""deltascatter: scattering, Jost solutions and wave operators for delta plus regular potentials"""
