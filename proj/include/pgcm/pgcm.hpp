#pragma once

#include "finite_field.hpp"
#include "matrices.hpp"
#include "report.hpp"
#include "pair_forms.hpp"
#include "iso_action.hpp"
#include "families.hpp"
#include "group_model.hpp"
#include "classifier.hpp"
#include "invariants.hpp"
