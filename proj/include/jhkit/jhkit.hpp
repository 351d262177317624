#pragma once

#include "jhkit/cli.hpp"
#include "jhkit/constants.hpp"
#include "jhkit/dilation.hpp"
#include "jhkit/errors.hpp"
#include "jhkit/forms.hpp"
#include "jhkit/forms_oracle.hpp"
#include "jhkit/parallel.hpp"
#include "jhkit/quadrature.hpp"
#include "jhkit/report.hpp"
#include "jhkit/specfun.hpp"
#include "jhkit/specfun_oracle.hpp"
#include "jhkit/virial.hpp"
