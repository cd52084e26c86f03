#pragma once

#include "holder3/complex_rational.hpp"
#include "holder3/config.hpp"
#include "holder3/curve.hpp"
#include "holder3/fit.hpp"
#include "holder3/geometry.hpp"
#include "holder3/halton.hpp"
#include "holder3/holder.hpp"
#include "holder3/holo_map.hpp"
#include "holder3/mixed_poly.hpp"
#include "holder3/newton_diagram.hpp"
#include "holder3/normal_form.hpp"
#include "holder3/parser.hpp"
#include "holder3/report.hpp"
#include "holder3/slice.hpp"
