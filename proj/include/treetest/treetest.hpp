#pragma once

#include "treetest/error.hpp"
#include "treetest/fasta.hpp"
#include "treetest/gw.hpp"
#include "treetest/io.hpp"
#include "treetest/mean.hpp"
#include "treetest/pairwise.hpp"
#include "treetest/permutation_test.hpp"
#include "treetest/random.hpp"
#include "treetest/tree.hpp"
#include "treetest/vlmc.hpp"
