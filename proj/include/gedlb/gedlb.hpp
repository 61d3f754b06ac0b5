#pragma once

#include <gedlb/certify.hpp>
#include <gedlb/conic.hpp>
#include <gedlb/errors.hpp>
#include <gedlb/families.hpp>
#include <gedlb/graph.hpp>
#include <gedlb/io.hpp>
#include <gedlb/linalg.hpp>
#include <gedlb/random.hpp>
#include <gedlb/relax.hpp>
#include <gedlb/sets.hpp>
#include <gedlb/spectra.hpp>
