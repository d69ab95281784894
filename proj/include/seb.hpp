#pragma once

#include "seb/activity.hpp"
#include "seb/config.hpp"
#include "seb/control.hpp"
#include "seb/diagnostic.hpp"
#include "seb/graph_io.hpp"
#include "seb/manifest.hpp"
#include "seb/parser.hpp"
#include "seb/properties.hpp"
#include "seb/sexpr.hpp"
#include "seb/sos.hpp"
#include "seb/transforms.hpp"
#include "seb/variables.hpp"
#include "seb/wellformed.hpp"
