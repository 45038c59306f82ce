"""Documents used by the parser round-trip check."""

DOCUMENTS = [
    "generator e = s^(5/2)*L^2 + (1 + 2*b)*s^(1/2);\nanalyze e;\n",
    "param sigma;\ngenerator e = s^(5/2)*L^2 + s^(1/2);\ncov c = subst t*(1+sigma*t);\npushforward e by c;\n",
    "cov c = theta a;\n",
    "generator phi = s^(5/2)*L^1 + (1 + b)*s^(1/2);\nanalyze phi;\nannihilator phi;\n",
    "series S = 1 + b;\ngenerator phi = s^(5/2)*L^1 + S*s^(1/2);\n",
    "presentation P = [5/2, 9/2] [1 + 5*b^3];\ncov c = theta 2*a + a^3;\npushforward P by c;\n",
    "param t2, t3;\npresentation P = [5/2, 9/2] [1 + 5*b^3];\ncov c = theta a + t2*a^2 + t3*a^3;\npushforward P by c;\n",
    "generator x = s^(3/2);\nanalyze x;\n",
    "generator x = -s^(3/2) + 2*s^(5/2);\n",
    "generator x = 1/2*s^(1/3)*L^1 - 3/4*b^2*s^(1/3);\n",
    "generator x = (1 - b)^2*s^(7/2)*L^2 + b*s^(7/2)*L^1 + s^(3/2);\n",
    "param u;\ngenerator x = u*s^(1/2)*L^1 + (u + b)*s^(1/2);\n",
    "series S = 1 - b + b^2;\nseries T = S*S;\ngenerator y = T*s^(2)*L^1 + s^(1);\n",
    "cov c = subst t + t^2;\ncov d = theta a - 1/2*a^2;\n",
    "presentation P = [3/2] [];\nanalyze P;\n",
    "presentation Q = [5/2, 7/2] [1 - 15/8*b^2];\nannihilator Q;\n",
    "presentation R = [7/2, 9/2, 7/2] [1 + 1/2*b + 15/16*b^2, 1];\n",
    "param k;\ncov c = theta -a + k*a^2;\n",
    "generator x = (2)*s^(1/2);\n",
    "generator x = ((1 + b))*s^(1/2)*L^1 + (-2)*s^(1/2);\n",
    "generator x = 3*b*s^(4/3)*L^1 + -b^2*s^(1/3);\n",
    "series S = -(1 + b) + 2;\n",
    "series S = (1/2)^2 + b^3*(b - 1);\n",
    "series S = 1 - -b;\n",
    "param p, q, r;\nseries S = p*q + r*b;\n",
    "# a comment line\ngenerator x = s^(1/2); # trailing\n",
    "generator x = s^(9/4)*L^3 + s^(5/4)*L^1 + s^(1/4);\nanalyze x;\n",
    "cov c = subst 2*t + t^3;\n",
    "cov c = theta 3*a;\n",
    "generator x = s^(5/2)*L^2 + (1 + (b + b^2))*s^(1/2);\n",
    "generator x = b^2*b*s^(1/2)*L^1 + s^(3/2);\n",
    "series A = (1 + b)*(1 - b);\nseries B = A^2 - 1;\n",
    "series S = -(b*b) + -(-(1 + b));\n",
]
