"""
Quasilinear part of the damped Euler system in (sigma, U) variables:

    B_{sigma,U}(sigma_1, U_1) = -(U.grad sigma_1 + theta sigma div U_1,
                                  theta sigma grad sigma_1 + U.grad U_1)

and the full right-hand side A + B_{sigma,U} evaluated at (sigma, U) itself.
"""

import numpy as np

from ..linear.propagator import apply_A
from ..spectral.calculus import derivative_symbol, gradient_coeffs
from ..spectral.fields import State, inverse
from ..spectral.products import dealias, masked_forward, masked_samples
from .gas import GasParameters


def apply_B(coefficients: State, argument: State, params: GasParameters) -> State:
    """
    Bilinear B with all products dealiased.

    Args:
        coefficients: (sigma, U) frozen into the operator
        argument: (sigma_1, U_1) it acts on
        params: Gas parameters

    Raises:
        GridMismatch: If the two states live on different grids
    """
    coefficients.check_grid(argument)
    grid = coefficients.grid
    coef = masked_samples(grid, coefficients.data)
    sigma, velocity = coef[0], coef[1:]

    grad = inverse(grid, gradient_coeffs(grid, dealias(grid, argument.data)))
    grad_sigma1 = grad[:, 0]
    grad_u1 = grad[:, 1:]
    div_u1 = np.trace(grad_u1, axis1=0, axis2=1)

    out = np.empty(coef.shape)
    out[0] = -(np.sum(velocity * grad_sigma1, axis=0) + params.theta * sigma * div_u1)
    out[1:] = -(params.theta * sigma * grad_sigma1 + np.einsum("j...,ji...->i...", velocity, grad_u1))
    return State(grid, masked_forward(grid, out))


def apply_B_adjoint(coefficients: State, argument: State, params: GasParameters) -> State:
    """
    Adjoint of apply_B(coefficients, .) under the coefficient inner product:

        B^*(p, q) = (div(U p) + div(theta sigma q), grad(theta sigma p) + [div(U q_i)]_i)
    """
    coefficients.check_grid(argument)
    grid = coefficients.grid
    coef = masked_samples(grid, coefficients.data)
    sigma, velocity = coef[0], coef[1:]
    arg = masked_samples(grid, argument.data)
    p, q = arg[0], arg[1:]
    symbol = derivative_symbol(grid)

    flux = masked_forward(grid, velocity * p + params.theta * sigma * q)
    scaled_p = masked_forward(grid, params.theta * sigma * p)
    transport = masked_forward(grid, velocity[:, None] * q[None, :])

    out = np.empty_like(argument.data)
    out[0] = np.sum(symbol * flux, axis=0)
    out[1:] = symbol * scaled_p + np.sum(symbol[:, None] * transport, axis=0)
    return State(grid, out)


def full_rhs(state: State, params: GasParameters, nonlinear: bool = True) -> State:
    """(A + B_{sigma,U})(sigma, U); with nonlinear=False only the exact linear part."""
    linear = apply_A(state)
    if not nonlinear:
        return linear
    return linear + apply_B(state, state, params)


def linearized_rhs(coefficients: State, argument: State, params: GasParameters) -> State:
    """(A + B_{coefficients}) argument."""
    return apply_A(argument) + apply_B(coefficients, argument, params)
