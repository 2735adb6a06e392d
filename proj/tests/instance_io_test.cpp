#include <gtest/gtest.h>

#include "support.hpp"

using namespace minereduce;
using namespace testing_support;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return 0;
}

const char* kTwoCustomers =
    "NAME tiny\n"
    "N 2 M 2\n"
    "VEHICLES\n"
    "10 5 1 -1\n"
    "20 9 1.5 3\n"
    "NODES\n"
    "0 0 0 0\n"
    "1 3 4 2\n"
    "2 6 8 7\n";

}  // namespace

TEST(ParseInstance, OneCustomer) {
  const auto inst = parse_instance("NAME one\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n1 0 2 5\n");
  EXPECT_EQ(inst.name, "one");
  EXPECT_EQ(inst.customer_count(), 1u);
  EXPECT_FALSE(inst.fleet[0].count.has_value());
  EXPECT_EQ(inst.dist(0, 1), 2.0);
  EXPECT_EQ(inst.demand(1), 5.0);
}

TEST(ParseInstance, EuclideanAndFleet) {
  const auto inst = parse_instance(kTwoCustomers);
  EXPECT_EQ(inst.dist(0, 1), 5.0);
  EXPECT_EQ(inst.dist(0, 2), 10.0);
  EXPECT_EQ(inst.dist(2, 1), 5.0);
  ASSERT_EQ(inst.fleet.size(), 2u);
  EXPECT_EQ(inst.fleet[1].count, std::optional<std::size_t>(3));
  EXPECT_EQ(inst.fleet[1].unit_cost, 1.5);
}

TEST(ParseInstance, UnroundedEuclidean) {
  const auto inst = parse_instance("NAME r\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n1 1 1 1\n");
  EXPECT_DOUBLE_EQ(inst.dist(0, 1), std::sqrt(2.0));
}

TEST(ParseInstance, MatrixPassesThroughAsymmetry) {
  const auto inst = parse_instance(std::string(kTwoCustomers) +
                                   "# explicit distances\n"
                                   "MATRIX\n0 1 2\n3 0 4\n5 6 0\n");
  EXPECT_EQ(inst.dist(0, 1), 1.0);
  EXPECT_EQ(inst.dist(1, 0), 3.0);
  EXPECT_EQ(inst.dist(2, 1), 6.0);
}

TEST(ParseInstance, Lengths) {
  const auto inst = parse_instance(std::string(kTwoCustomers) + "LENGTHS\n0 1.5 2\n");
  EXPECT_EQ(inst.length(1), 1.5);
  EXPECT_EQ(inst.length(2), 2.0);
  Solution one_route = make_solution(inst, {Route{0, {1, 2}}});
  EXPECT_DOUBLE_EQ(one_route.cost, 5 + 1 * (5 + 5 + 10 + 3.5));
}

TEST(ParseInstance, ErrorsReportTheLine) {
  EXPECT_EQ(error_line("NAME x\nM 1 N 1\n"), 2u);
  EXPECT_EQ(error_line("NAME x\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n2 0 2 5\n"), 7u);
  EXPECT_EQ(error_line("NAME x\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n1 0 2 -5\n"), 7u);
  EXPECT_EQ(error_line("NAME x\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n1 0 2 5\nMATRIX\n0 1\n2\n"), 10u);
  EXPECT_EQ(error_line("NAME x\nN 1 M 1\nVEHICLES\n5 0 1 -7\nNODES\n0 0 0 0\n1 0 2 5\n"), 4u);
  EXPECT_EQ(error_line("NAME x\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n1 0 2 5\nEXTRA\n"), 8u);
  EXPECT_EQ(error_line("NAME x\nN 1 M 1\nVEHICLES\n5 0 1 -1\nNODES\n0 0 0 0\n1 0 2 abc\n"), 7u);
}

TEST(WriteInstance, RoundTripPreservesEverything) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    RandomSpec spec;
    spec.customers = 1 + rng.below(15);
    spec.types = 1 + rng.below(3);
    spec.asymmetric = rng.chance(0.5);
    spec.lengths = rng.chance(0.5);
    spec.limited = rng.chance(0.5);
    Instance inst = random_instance(rng, spec);
    // Irrational entries exercise full-precision output.
    inst.dist.at(0, 1) = std::sqrt(2.0) * 7;
    const Instance back = parse_instance(format_instance(inst));
    EXPECT_EQ(format_instance(back), format_instance(inst)) << trial;
    for (VertexId a = 0; a < static_cast<VertexId>(inst.vertex_count()); ++a)
      for (VertexId b = 0; b < static_cast<VertexId>(inst.vertex_count()); ++b) ASSERT_EQ(back.dist(a, b), inst.dist(a, b));
    EXPECT_EQ(back.fleet, inst.fleet);
  }
}

TEST(WriteInstance, CoordinatesOnly) {
  const auto inst = parse_instance(kTwoCustomers);
  const std::string text = format_instance(inst, {.matrix = false});
  EXPECT_EQ(text.find("MATRIX"), std::string::npos);
  EXPECT_EQ(parse_instance(text).dist(0, 2), 10.0);
}

TEST(ConvertCvrplib, EuclideanWithDepotFirst) {
  const char* text =
      "NAME : toy\n"
      "COMMENT : three nodes\n"
      "TYPE : CVRP\n"
      "DIMENSION : 3\n"
      "EDGE_WEIGHT_TYPE : EUC_2D\n"
      "CAPACITY : 10\n"
      "NODE_COORD_SECTION\n"
      "1 3 4\n2 0 0\n3 6 8\n"
      "DEMAND_SECTION\n"
      "1 4\n2 0\n3 6\n"
      "DEPOT_SECTION\n 2\n -1\n"
      "EOF\n";
  const auto inst = convert_cvrplib(text, {VehicleType{10, 0, 1, std::nullopt}});
  EXPECT_EQ(inst.name, "toy");
  ASSERT_EQ(inst.vertex_count(), 3u);
  EXPECT_EQ(inst.demand(1), 4.0);
  EXPECT_EQ(inst.demand(2), 6.0);
  EXPECT_EQ(inst.dist(0, 1), 5.0);
  EXPECT_EQ(inst.dist(0, 2), 10.0);
}

TEST(ConvertCvrplib, ExplicitMatrix) {
  const char* text =
      "NAME: m\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
      "EDGE_WEIGHT_SECTION\n0 3\n4 0\nDEMAND_SECTION\n1 0\n2 2\nDEPOT_SECTION\n1\n-1\nEOF\n";
  const auto inst = convert_cvrplib(text, {VehicleType{5, 1, 1, 2}});
  EXPECT_EQ(inst.dist(0, 1), 3.0);
  EXPECT_EQ(inst.dist(1, 0), 4.0);
  EXPECT_THROW(convert_cvrplib("NAME: m\nDIMENSION: 2\nFOO 1\n", {VehicleType{5, 1, 1, 2}}), ParseError);
  EXPECT_THROW(convert_cvrplib("NAME: m\nDIMENSION: 2\nEOF\n", {VehicleType{5, 1, 1, 2}}), ParseError);
}

TEST(Generator, ValidAndReproducible) {
  for (bool limited : {false, true}) {
    GeneratorOptions opt;
    opt.customers = 40;
    opt.limited_fleet = limited;
    Rng a(9), b(9);
    const Instance x = generate_instance(opt, a, "g");
    const Instance y = generate_instance(opt, b, "g");
    EXPECT_EQ(format_instance(x), format_instance(y));
    EXPECT_NO_THROW(validate(x));
    EXPECT_TRUE(x.capacity_sufficient());
    EXPECT_EQ(x.customer_count(), 40u);
    for (const auto& t : x.fleet) EXPECT_EQ(t.count.has_value(), limited);
  }
  GeneratorOptions none;
  none.customers = 0;
  Rng rng(1);
  EXPECT_THROW(generate_instance(none, rng), UsageError);
}
