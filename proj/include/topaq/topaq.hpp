#pragma once

#include "constructions.hpp"
#include "deciders.hpp"
#include "model_io.hpp"
#include "observers.hpp"
#include "oracle.hpp"
#include "rational.hpp"
#include "regions.hpp"
#include "semantics.hpp"
#include "ta.hpp"
#include "words.hpp"
