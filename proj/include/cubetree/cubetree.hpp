#pragma once

#include "audit.hpp"
#include "embeddings.hpp"
#include "error.hpp"
#include "hamming.hpp"
#include "ordinals.hpp"
#include "rational.hpp"
#include "treespace.hpp"
