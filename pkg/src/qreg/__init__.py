"""Regularized stationary states with an inverse-square information barrier.

The package is organised bottom-up:

* :mod:`qreg.specfun`     real-order Bessel, Kummer/Whittaker, Hermite/Laguerre kernels
* :mod:`qreg.model`       parameters, systems, grids, effective potentials, phase
* :mod:`qreg.analytic`    closed-form amplitudes and spectra as printed
* :mod:`qreg.oracle`      finite-difference Sturm-bisection eigensolver
* :mod:`qreg.variational` Fisher information, quantum potential, residual identities
* :mod:`qreg.pipeline`    verify/compare orchestration used by :mod:`qreg.cli`
"""

__version__ = "0.1.0"
