#pragma once

#include "dimtrunc/experiment.hpp"
#include "dimtrunc/expression.hpp"
#include "dimtrunc/gaussian.hpp"
#include "dimtrunc/model1.hpp"
#include "dimtrunc/model2.hpp"
#include "dimtrunc/quadrature.hpp"
#include "dimtrunc/rates.hpp"
#include "dimtrunc/sequences.hpp"
#include "dimtrunc/source.hpp"
