#pragma once

#include "specrecon/deck.hpp"
#include "specrecon/eigh.hpp"
#include "specrecon/errors.hpp"
#include "specrecon/matrix.hpp"
#include "specrecon/recon_verify.hpp"
#include "specrecon/secular.hpp"
#include "specrecon/spectrum.hpp"
#include "specrecon/square_recon.hpp"
