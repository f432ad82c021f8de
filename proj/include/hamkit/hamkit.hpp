#ifndef HAMKIT_HAMKIT_HPP
#define HAMKIT_HAMKIT_HPP

#include "hamkit/certificate.hpp"
#include "hamkit/cone.hpp"
#include "hamkit/config.hpp"
#include "hamkit/errors.hpp"
#include "hamkit/expression.hpp"
#include "hamkit/hypotheses.hpp"
#include "hamkit/kernel.hpp"
#include "hamkit/monotone_split.hpp"
#include "hamkit/quadrature.hpp"
#include "hamkit/rational.hpp"
#include "hamkit/run.hpp"
#include "hamkit/solver.hpp"

#endif // HAMKIT_HAMKIT_HPP
