#ifndef QRMSIM_QRMSIM_HPP
#define QRMSIM_QRMSIM_HPP

#include "qrmsim/hilbert.hpp"
#include "qrmsim/hamiltonian.hpp"
#include "qrmsim/dynamics.hpp"
#include "qrmsim/spectral.hpp"
#include "qrmsim/regimes.hpp"
#include "qrmsim/experiments.hpp"

#endif
