import setuptools_scm  # Ensure this is present
import setuptools; setuptools.setup()
