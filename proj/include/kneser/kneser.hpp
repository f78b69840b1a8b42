#pragma once

#include "kneser/analysis.hpp"
#include "kneser/bitset.hpp"
#include "kneser/chamber_graph.hpp"
#include "kneser/clique.hpp"
#include "kneser/error.hpp"
#include "kneser/families.hpp"
#include "kneser/galois.hpp"
#include "kneser/geometry.hpp"
#include "kneser/io.hpp"
#include "kneser/search.hpp"
#include "kneser/spreads.hpp"
