# Copyright (c) 2024 The entropicemd developers


from setuptools import setup


def readme():
    with open('README.rst') as f:
        return f.read()


packages = [
        'entropicemd',
        'entropicemd.lib',
        'entropicemd.util',
        'entropicemd.models'
        ]

package_dir = {
        'entropicemd': 'src',
        'entropicemd.lib': 'src/lib',
        'entropicemd.util': 'src/util',
        'entropicemd.models': 'src/models'
        }

setup(name='entropicemd',
      version='1.0',
      description='Entropy-guided empirical mode decomposition for '
                  'intermittent signals',
      long_description=readme(),
      packages=packages,
      package_dir=package_dir,
      license='MIT',
      python_requires='>=3.9',
      install_requires=['numpy>=1.20', 'torch>=1.13', 'scipy>=1.7'],
      extras_require={'test': ['pytest>=7']},
      entry_points={
          'console_scripts': ['entropic-emd=entropicemd.models.cli:main']
          },
      zip_safe=False
      )
