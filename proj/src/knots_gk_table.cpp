#include "sparsegrid/knots.hpp"

// Generated by tools/gen_gk_table.cpp (100-digit arithmetic, rounded to double).

namespace sparsegrid::detail {

namespace {

Rule1D make(std::initializer_list<double> nodes, std::initializer_list<double> weights)
{
    Rule1D r{VectorXd(static_cast<Index>(nodes.size())), VectorXd(static_cast<Index>(weights.size()))};
    Index i = 0;
    for (double x : nodes) r.nodes[i++] = x;
    i = 0;
    for (double w : weights) r.weights[i++] = w;
    return r;
}

}  // namespace

const Rule1D& gk_table(int count)
{
    // 1 points, degree of exactness 1
    static const Rule1D gk1 = make(
        {0},
        {1});
    // 3 points, degree of exactness 5
    static const Rule1D gk3 = make(
        {-1.7320508075688772,
         0,
         1.7320508075688772},
        {0.16666666666666666,
         0.66666666666666663,
         0.16666666666666666});
    // 9 points, degree of exactness 15
    static const Rule1D gk9 = make(
        {-4.1849560176727323,
         -2.8612795760570582,
         -1.7320508075688772,
         -0.74109534999454085,
         0,
         0.74109534999454085,
         1.7320508075688772,
         2.8612795760570582,
         4.1849560176727323},
        {9.4269457556517484e-05,
         0.0079963254708935328,
         0.094850948509485097,
         0.27007432957793787,
         0.25396825396825395,
         0.27007432957793787,
         0.094850948509485097,
         0.0079963254708935328,
         9.4269457556517484e-05});
    // 19 points, degree of exactness 29
    static const Rule1D gk19 = make(
        {-6.3633944943363696,
         -5.1870160399136562,
         -4.1849560176727323,
         -3.2053337944991944,
         -2.8612795760570582,
         -2.5960831150492023,
         -1.7320508075688772,
         -1.230423634027306,
         -0.74109534999454085,
         0,
         0.74109534999454085,
         1.230423634027306,
         1.7320508075688772,
         2.5960831150492023,
         2.8612795760570582,
         3.2053337944991944,
         4.1849560176727323,
         5.1870160399136562,
         6.3633944943363696},
        {8.6296846022298859e-10,
         6.094808731468983e-07,
         6.012336945984782e-05,
         0.0028848804365067511,
         -0.0063372247933737354,
         0.018085234254798452,
         0.064096054686807583,
         0.061151730125247675,
         0.20832499164960888,
         0.30346719985420589,
         0.20832499164960888,
         0.061151730125247675,
         0.064096054686807583,
         0.018085234254798452,
         -0.0063372247933737354,
         0.0028848804365067511,
         6.012336945984782e-05,
         6.094808731468983e-07,
         8.6296846022298859e-10});
    // 35 points, degree of exactness 51
    static const Rule1D gk35 = make(
        {-9.0169397898903032,
         -7.9807717985905606,
         -7.1221067008046166,
         -6.3633944943363696,
         -5.6981777684881099,
         -5.1870160399136562,
         -4.7364330859522967,
         -4.1849560176727323,
         -3.6353185190372783,
         -3.2053337944991944,
         -2.8612795760570582,
         -2.5960831150492023,
         -2.2336260616769414,
         -1.7320508075688772,
         -1.230423634027306,
         -0.74109534999454085,
         -0.24899229757996061,
         0,
         0.24899229757996061,
         0.74109534999454085,
         1.230423634027306,
         1.7320508075688772,
         2.2336260616769414,
         2.5960831150492023,
         2.8612795760570582,
         3.2053337944991944,
         3.6353185190372783,
         4.1849560176727323,
         4.7364330859522967,
         5.1870160399136562,
         5.6981777684881099,
         6.3633944943363696,
         7.1221067008046166,
         7.9807717985905606,
         9.0169397898903032},
        {1.0541326582333341e-18,
         5.4500412650636897e-15,
         3.097222357606316e-12,
         4.6011760348656186e-10,
         2.1394194479561105e-08,
         2.4676421345798077e-07,
         2.7342206801187829e-06,
         3.5729348198975102e-05,
         0.00027524214116785158,
         0.00081895392750226486,
         0.0023113452403522102,
         0.0031554462691875639,
         0.015673473751851151,
         0.045273685465150516,
         0.092364726716986312,
         0.14807083115521599,
         0.19176011588804442,
         0.00051489450806878432,
         0.19176011588804442,
         0.14807083115521599,
         0.092364726716986312,
         0.045273685465150516,
         0.015673473751851151,
         0.0031554462691875639,
         0.0023113452403522102,
         0.00081895392750226486,
         0.00027524214116785158,
         3.5729348198975102e-05,
         2.7342206801187829e-06,
         2.4676421345798077e-07,
         2.1394194479561105e-08,
         4.6011760348656186e-10,
         3.097222357606316e-12,
         5.4500412650636897e-15,
         1.0541326582333341e-18});
    switch (count) {
    case 1: return gk1;
    case 3: return gk3;
    case 9: return gk9;
    case 19: return gk19;
    case 35: return gk35;
    default:
        throw UnsupportedError("Genz-Keister rules exist for 1, 3, 9, 19, 35 points only, got " +
                               std::to_string(count));
    }
}

}  // namespace sparsegrid::detail
