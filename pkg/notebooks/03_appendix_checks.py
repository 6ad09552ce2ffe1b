#!/usr/bin/env python
# coding: utf-8

# # Numeric checks behind the explicit constants
#
# Reciprocal prime sums, the special-sum thresholds u(m) and the Mertens-type
# sweeps are all verified with outward-rounded arithmetic.

# In[1]:


from jacobsthal.analysis import (
    short_appendix_sum,
    special_sum_u,
    verify_pi_lower,
    verify_sigma_upper,
    verify_u_threshold,
)
from jacobsthal.primes import shared_table


# The reciprocal sum over p_4..p_29 stays below 0.9.

# In[2]:


enc = short_appendix_sum()
print(enc.lo, enc.hi)


# u(m) is the first index where the running reciprocal sum from p_m reaches 1.

# In[3]:


table = shared_table(min_limit=10**7)
for m in (3, 20, 40, 60):
    r = special_sum_u(m, table)
    print(m, r.p_m, r.u, round(r.ratio, 4), r.exceeds_threshold)


# In[4]:


rep = verify_u_threshold(range(20, 61), table)
print("u threshold m=20..60:", rep.passed, rep.failures)


# Both Mertens-type inequalities hold for every p_k below 10^7.

# In[5]:


s = verify_sigma_upper(10**7, table)
p = verify_pi_lower(10**7, table)
print("sigma:", s.checked, s.passed, " pi:", p.checked, p.passed)
