#ifndef KMEASURE_KMEASURE_HPP
#define KMEASURE_KMEASURE_HPP

#include "identities.hpp"
#include "partitions.hpp"
#include "report.hpp"
#include "series.hpp"
#include "suite.hpp"
#include "tables.hpp"

#endif // KMEASURE_KMEASURE_HPP
