#pragma once

#include "burkholder/potentials/adagrad.hpp"
#include "burkholder/potentials/combine.hpp"
#include "burkholder/potentials/matrix.hpp"
#include "burkholder/potentials/meta.hpp"
#include "burkholder/potentials/param_free.hpp"
#include "burkholder/potentials/vaw.hpp"
