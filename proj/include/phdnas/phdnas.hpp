#pragma once

#include "phdnas/bench.hpp"
#include "phdnas/errors.hpp"
#include "phdnas/hypervolume.hpp"
#include "phdnas/moea.hpp"
#include "phdnas/mutual_information.hpp"
#include "phdnas/objectives.hpp"
#include "phdnas/pareto.hpp"
#include "phdnas/searchspace.hpp"
#include "phdnas/table.hpp"
