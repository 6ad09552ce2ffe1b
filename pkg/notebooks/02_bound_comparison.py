#!/usr/bin/env python
# coding: utf-8

# # Comparing the explicit upper bounds
#
# Every bound in the suite is evaluated on the same radical and reported as a
# certified value.  Values below 2^256 are exact integers; larger ones are
# carried as certified log2 enclosures.

# In[1]:


from jacobsthal import Radical, best_bound, evaluate_suite, g_exact
from jacobsthal.analysis import crossover


# In[2]:


rad = Radical.primorial(6)
print("exact g:", g_exact(rad).g)
for rep in evaluate_suite(rad):
    val = rep.g_value()
    shown = val.render() if val is not None else f"n/a ({rep.reason})"
    print(f"{rep.name:22s} {shown}")


# The best applicable bound (exact scan excluded) for a non-primorial radical.

# In[3]:


rad = Radical.of([7, 11, 13, 17, 19, 23])
best = best_bound(rad, include_exact=False)
print(rad, best.name, best.g_value().render(), " exact:", g_exact(rad).g)


# Where does one bound overtake another along the primorials?  The crossover
# search compares certified log2 enclosures, so a reported k* is never a
# rounding artefact.

# In[4]:


c = crossover("stevens_published", "kanold_2k", range(2, 2001))
print("stevens_published first below 2^k at k =", c.k_star)
for k in (10**4, 60000, 10**5):
    print(k, crossover("improvement", "kanold_sqrt", [k]).k_star is not None)
