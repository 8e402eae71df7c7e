#pragma once

#include "nucleus/builders.hpp"
#include "nucleus/bucket.hpp"
#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/gen.hpp"
#include "nucleus/graph.hpp"
#include "nucleus/hierarchy.hpp"
#include "nucleus/io.hpp"
#include "nucleus/oracle.hpp"
#include "nucleus/peel.hpp"
#include "nucleus/peel_approx.hpp"
#include "nucleus/union_find.hpp"
