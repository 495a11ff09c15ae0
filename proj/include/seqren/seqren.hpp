#pragma once

#include "canonical.hpp"
#include "certificate.hpp"
#include "derived.hpp"
#include "generators.hpp"
#include "imll.hpp"
#include "lambda.hpp"
#include "prover.hpp"
#include "rules.hpp"
#include "simulate.hpp"
#include "structure.hpp"
#include "translate.hpp"
